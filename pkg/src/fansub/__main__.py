from fansub.cli import main
import sys

sys.exit(main())
