import sys

from dualcox.cli import main

sys.exit(main())
