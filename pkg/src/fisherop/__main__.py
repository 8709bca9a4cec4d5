import sys

from fisherop.cli import main

sys.exit(main())
