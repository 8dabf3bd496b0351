#include <cstdio>

int main() {
  std::puts("semitop: placeholder");
  return 0;
}
