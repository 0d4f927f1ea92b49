import sys

from mortonrrt.cli import main

sys.exit(main())
