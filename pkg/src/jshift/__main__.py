import sys

from jshift.cli import main

sys.exit(main())
