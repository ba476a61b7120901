import sys

from weyl_lab.cli import main

sys.exit(main())
