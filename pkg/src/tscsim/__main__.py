import sys

from tscsim.cli import main

sys.exit(main())
