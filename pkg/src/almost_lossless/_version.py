"""Read the version of the installed package from the package resources."""

__version__ = "2610.0.0"

if __name__ == "__main__":
    print(__version__)
