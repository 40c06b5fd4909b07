// Prints the shortest synchronizing word of the cyclic family for small n:
// the length follows (n-1)^2.

#include <iostream>

#include <synchro/synchro.hpp>

int main() {
    for (int n = 2; n <= 10; ++n) {
        synchro::Automaton a = synchro::cerny(n);
        synchro::SyncResult r = synchro::shortest_sync(a);
        std::cout << a.name << ": length " << r.length << " = (" << n << "-1)^2, witness "
                  << synchro::word_to_string(r.witness) << "\n";
    }
    return 0;
}
