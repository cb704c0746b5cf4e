import sys

from certpoly.cli import main

sys.exit(main())
