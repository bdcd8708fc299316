"""
Run the command line without installing the package: python run.py answer --kb ... --query ...
"""
from app.main import main

if __name__ == "__main__":
    main()
