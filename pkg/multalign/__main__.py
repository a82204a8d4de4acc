# Licensed under the MIT License.
"""
Entry point for program when called as a module
"""

from multalign.cli import main


if __name__ == "__main__":
    main()
