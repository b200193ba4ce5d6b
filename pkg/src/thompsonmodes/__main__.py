import sys

from thompsonmodes.cli import main

sys.exit(main())
