import sys

from advkit.bench.cli import main

sys.exit(main())
