#include <cstdio>

int main() {
    std::puts("cch_cli: not yet wired up");
    return 1;
}
