#include <cstdio>
int main(){ std::puts("acceptance pending"); return 1; }
