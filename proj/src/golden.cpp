#include "wpcn/golden.hpp"

namespace wpcn {

namespace detail {
std::atomic<unsigned long long>& golden_counter() {
    static std::atomic<unsigned long long> counter{0};
    return counter;
}
}  // namespace detail

unsigned long long golden_section_invocations() {
    return detail::golden_counter().load(std::memory_order_relaxed);
}

}  // namespace wpcn
