import sys

from khmix.main import main

sys.exit(main())
