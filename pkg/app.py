# app.py
#!/usr/bin/env python3
import sys

from dotenv import load_dotenv
from pydantic import ValidationError

from src.config.models import RunConfig
from src.ui.cli import main as cli_main


def main():
    # SUBALG_* variables from .env become RunConfig defaults; CLI flags still win
    load_dotenv()
    try:
        config = RunConfig()
    except ValidationError as e:
        raise SystemExit(f"❌ Configuration error: {e}")
    return cli_main(sys.argv[1:], config)


if __name__ == "__main__":
    raise SystemExit(main())
