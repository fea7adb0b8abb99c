import sys

from rmdspin.cli import main

sys.exit(main())
