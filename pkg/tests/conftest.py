import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
# allow running the suite from a fresh checkout without installing
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))
