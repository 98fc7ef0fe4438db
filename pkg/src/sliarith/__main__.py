"""python -m sliarith entry point."""

from .experiments import main

if __name__ == "__main__":
    main()
