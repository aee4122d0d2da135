# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
