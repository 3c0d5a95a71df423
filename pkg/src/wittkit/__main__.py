import sys

from wittkit.cli import main

sys.exit(main())
