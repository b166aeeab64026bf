import sys

from mechopt.cli import main

sys.exit(main())
