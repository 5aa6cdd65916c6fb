from . import cli


def main():
    cli.main()
