import sys

from wavepath.cli.main import main

sys.exit(main())
