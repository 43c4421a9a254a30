import sys

from igo_toolkit.cli import main

sys.exit(main())
