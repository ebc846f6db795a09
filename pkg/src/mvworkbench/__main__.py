import sys

from mvworkbench.cli import main

sys.exit(main())
