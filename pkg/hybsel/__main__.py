import sys

from hybsel.bench_cli.cli import main

sys.exit(main())
