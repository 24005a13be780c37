import sys

from spectral_green.cli.main import main

sys.exit(main())
