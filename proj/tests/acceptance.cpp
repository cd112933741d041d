// End-to-end acceptance suite. Each criterion prints exactly one
// [PASS]/[FAIL] line; the binary exits nonzero if any criterion fails.

#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

namespace {

struct Criterion {
    int number;
    std::string title;
    std::function<void()> run; // throws std::runtime_error on failure
};

std::vector<Criterion>& registry() {
    static std::vector<Criterion> r;
    return r;
}

} // namespace

void register_acceptance_criteria(std::vector<Criterion>& out);

int main() {
    register_acceptance_criteria(registry());
    int failures = 0;
    for (const auto& c : registry()) {
        std::string verdict = "PASS";
        std::string detail;
        try {
            c.run();
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
            ++failures;
        } catch (...) {
            verdict = "FAIL";
            detail = "unknown error";
            ++failures;
        }
        std::printf("[%s] criterion %d: %s%s%s\n", verdict.c_str(), c.number,
                    c.title.c_str(), detail.empty() ? "" : " — ", detail.c_str());
        std::fflush(stdout);
    }
    if (registry().empty()) {
        std::printf("[FAIL] no acceptance criteria registered\n");
        return 1;
    }
    std::printf("%zu criteria, %d failed\n", registry().size(), failures);
    return failures == 0 ? 0 : 1;
}

// Placeholder registration; criteria are appended as their modules land.
void register_acceptance_criteria(std::vector<Criterion>&) {}
