import sys

from fairdiv.cli import main

sys.exit(main())
