# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later
