import sys

from podq.cli import main

sys.exit(main())
