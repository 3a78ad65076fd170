import sys

from pun.cli import main

sys.exit(main())
