#include <iostream>

#include <sailhelm/metrics.hpp>

int main() {
  std::cout << sailhelm::distance_made_good({0, 10}, sailhelm::Bearing(0)) << "\n";
}
