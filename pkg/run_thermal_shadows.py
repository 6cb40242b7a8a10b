# run_thermal_shadows.py
# Launcher for running the lab from a source checkout without installing it

import sys

from thermal_shadows.cli import main

if __name__ == "__main__":
    sys.exit(main())
