#include <cstdio>

int main() {
  std::puts("wasym: not wired up yet");
  return 2;
}
