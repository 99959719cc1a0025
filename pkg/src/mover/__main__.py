import sys

from mover.cli import main

sys.exit(main())
