import os
import sys

# The extension module is built by CMake; ctest points here via GUIGAN_MODULE_DIR.
_module_dir = os.environ.get("GUIGAN_MODULE_DIR")
if _module_dir and _module_dir not in sys.path:
    sys.path.insert(0, _module_dir)
