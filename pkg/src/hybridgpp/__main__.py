"""``python -m hybridgpp``."""
from .cli import main

main()
