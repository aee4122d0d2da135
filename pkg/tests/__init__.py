# Copyright 2024 Paul Niklas Ruth.
# SPDX-License-Identifier: MPL-2.0

