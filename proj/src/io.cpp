#include "hetero/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace hetero {

void profile_to_csv(const HeteroclinicProfile& p, std::ostream& os) {
    os << "t,q,qprime,energy_residual\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < p.size(); ++i)
        os << p.t[i] << ',' << p.q[i] << ',' << p.q_prime[i] << ',' << p.energy_residual[i]
           << '\n';
}

void profile_to_csv_file(const HeteroclinicProfile& p, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw evaluation_error("cannot open for writing: " + path);
    profile_to_csv(p, os);
}

HeteroclinicProfile profile_from_csv(std::istream& is) {
    HeteroclinicProfile p;
    std::string line;
    if (!std::getline(is, line) || line != "t,q,qprime,energy_residual")
        throw evaluation_error("profile CSV: bad or missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double vals[4];
        char comma;
        if (!(row >> vals[0] >> comma >> vals[1] >> comma >> vals[2] >> comma >> vals[3]))
            throw evaluation_error("profile CSV: malformed row: " + line);
        p.t.push_back(vals[0]);
        p.q.push_back(vals[1]);
        p.q_prime.push_back(vals[2]);
        p.energy_residual.push_back(vals[3]);
    }
    if (p.size() < 2) throw evaluation_error("profile CSV: too few rows");
    // Wells are not stored in CSV; callers with a potential in hand should
    // overwrite this data-range guess.
    p.wells = {p.q.front(), p.q.back()};
    return p;
}

HeteroclinicProfile profile_from_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw evaluation_error("cannot open: " + path);
    return profile_from_csv(is);
}

nlohmann::json profile_to_json(const HeteroclinicProfile& p) {
    return {{"t", p.t},
            {"q", p.q},
            {"q_prime", p.q_prime},
            {"energy_residual", p.energy_residual},
            {"wells", {p.wells.first, p.wells.second}},
            {"route", p.route == Route::cauchy ? "cauchy" : "variational"},
            {"normalization_shift", p.normalization_shift},
            {"kernel", p.kernel_name},
            {"potential", p.potential_name}};
}

HeteroclinicProfile profile_from_json(const nlohmann::json& j) {
    HeteroclinicProfile p;
    p.t = j.at("t").get<std::vector<double>>();
    p.q = j.at("q").get<std::vector<double>>();
    p.q_prime = j.at("q_prime").get<std::vector<double>>();
    p.energy_residual = j.at("energy_residual").get<std::vector<double>>();
    p.wells = {j.at("wells")[0].get<double>(), j.at("wells")[1].get<double>()};
    p.route = j.at("route").get<std::string>() == "variational" ? Route::variational
                                                                : Route::cauchy;
    p.normalization_shift = j.value("normalization_shift", 0.0);
    p.kernel_name = j.value("kernel", "");
    p.potential_name = j.value("potential", "");
    return p;
}

}  // namespace hetero
