#include <cstdio>

int main() {
    std::printf("xlate: command-line interface not wired up yet\n");
    return 2;
}
