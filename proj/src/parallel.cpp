#include "ncbesq/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ncbesq::parallel {

std::size_t default_jobs() {
    if (const char* env = std::getenv("NCBESQ_JOBS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace ncbesq::parallel
