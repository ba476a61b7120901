# SPDX-FileCopyrightText: 2023-present Tao Yang <swulling@gmail.com>
#
# SPDX-License-Identifier: MIT

from weyl_lab.ahcore import RationalMap, ah_bracket, eval_map, make_rational_map  # noqa: F401
from weyl_lab.brackets import classical_bracket_weyl, weyl_gradients  # noqa: F401
from weyl_lab.config import RunConfig, load_config  # noqa: F401
from weyl_lab.cover import CoverPoint, Sheet  # noqa: F401
from weyl_lab.dirac import transition_matrix  # noqa: F401
from weyl_lab.weyl import WeylValue, weyl_function  # noqa: F401
