#include "ptscatter/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ptscatter {

unsigned worker_count() {
    unsigned requested = 0;
    if (const char* env = std::getenv("PTSCATTER_THREADS")) {
        try {
            const long v = std::stol(env);
            requested = v > 0 ? static_cast<unsigned>(v) : 0U;
        } catch (const std::exception&) {
            requested = 0;
        }
    }
    if (requested == 0) {
        requested = std::max(1U, std::thread::hardware_concurrency());
    }
    return requested;
}

}  // namespace ptscatter
