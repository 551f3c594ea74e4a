import sys

from fracperiodic.cli.main import main

sys.exit(main())
