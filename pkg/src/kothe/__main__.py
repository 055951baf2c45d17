from kothe.cli import main

raise SystemExit(main())
