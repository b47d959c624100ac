// SPDX-License-Identifier: Apache-2.0
// placeholder; replaced by the full CLI later in the build
int main() { return 0; }
