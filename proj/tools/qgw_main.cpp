#include <iostream>
int main() { std::cout << "qgw\n"; return 0; }
