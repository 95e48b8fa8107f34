"""Write the golden monodromy matrices to a directory (default: ./goldens)."""
import sys

from hurwitz_fuchs import cli

if __name__ == "__main__":
    paths = cli.emit_goldens(sys.argv[1] if len(sys.argv) > 1 else "goldens")
    print(f"wrote {len(paths)} files")
