import sys

from rigidplane.cli import main

sys.exit(main())
