#include "rikit/verify.hpp"
namespace rikit::verify {
void Report::finalize() {}
nlohmann::json Report::to_json() const { return {}; }
Report run_case(const std::string&, const Params&) { return {}; }
std::vector<std::string> all_case_ids() { return {}; }
int run_all(const Params&, std::vector<Report>*) { return 0; }
}
