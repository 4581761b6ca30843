#include <des/des.hpp>
int main() { return 0; }
