#ifndef HETERO_IO_HPP
#define HETERO_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hetero/cauchy.hpp"

namespace hetero {

// CSV with the stable header "t,q,qprime,energy_residual", 17 significant
// digits.
void profile_to_csv(const HeteroclinicProfile& p, std::ostream& os);
void profile_to_csv_file(const HeteroclinicProfile& p, const std::string& path);
HeteroclinicProfile profile_from_csv(std::istream& is);
HeteroclinicProfile profile_from_csv_file(const std::string& path);

nlohmann::json profile_to_json(const HeteroclinicProfile& p);
HeteroclinicProfile profile_from_json(const nlohmann::json& j);

}  // namespace hetero

#endif
