#include <iostream>

int main() {
  std::cout << "tnsim placeholder\n";
  return 0;
}
