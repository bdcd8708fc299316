from app.cli.main import cli


def main() -> None:
    cli(prog_name="mwq")


if __name__ == "__main__":
    main()
