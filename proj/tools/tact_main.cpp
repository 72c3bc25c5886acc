#include <iostream>

int main() {
  std::cout << "tact placeholder\n";
  return 0;
}
