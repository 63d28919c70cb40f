# beamsense - sensing-aided mmWave beam prediction simulator and learning pipeline
# Copyright (C) 2026 beamsense contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python surface of the beamsense C++ core.

Installed wheels carry the extension inside this package; in-tree test
runs find it on sys.path next to the build directory.
"""

try:
    from ._beamsense import *  # noqa: F401,F403
    from ._beamsense import __version__  # noqa: F401
except ImportError:  # in-tree layout: extension built outside the package
    from _beamsense import *  # noqa: F401,F403
    from _beamsense import __version__  # noqa: F401
