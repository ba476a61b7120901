# SPDX-FileCopyrightText: 2023-present Tao Yang <swulling@gmail.com>
#
# SPDX-License-Identifier: MIT
