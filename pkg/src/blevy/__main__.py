"""Allow ``python -m blevy``."""

from blevy.cli.main import main

raise SystemExit(main())
