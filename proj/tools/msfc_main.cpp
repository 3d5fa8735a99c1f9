#include <cstdio>

int main() {
  std::puts("msfc: work in progress");
  return 0;
}
