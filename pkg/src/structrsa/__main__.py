import sys

from structrsa.cli import main

sys.exit(main())
