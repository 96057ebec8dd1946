import sys

from birthburst.cli import main

sys.exit(main())
