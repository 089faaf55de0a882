import sys

from mirror_born.cli import main

sys.exit(main())
