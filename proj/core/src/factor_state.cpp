#include "drslf/factor_state.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "drslf/error.hpp"
#include "drslf/format.hpp"

namespace drslf {

namespace {
constexpr const char* kMagic = "drslf-factors";
constexpr int kVersion = 1;
}  // namespace

void write_factors(const FactorState& x, std::ostream& out) {
    out << kMagic << ' ' << kVersion << '\n';
    out << x.rank() << ' ' << x.num_users() << ' ' << x.num_services() << '\n';
    const auto write_row = [&](std::span<const double> row) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k > 0) out << ' ';
            out << format_double(row[k]);
        }
        out << '\n';
    };
    for (std::size_t u = 0; u < x.num_users(); ++u) write_row(x.user(u));
    for (std::size_t s = 0; s < x.num_services(); ++s) write_row(x.service(s));
}

FactorState read_factors(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kMagic) throw DataError("not a factor dump");
    if (version != kVersion) throw DataError("unsupported factor dump version " + std::to_string(version));
    std::size_t f = 0, users = 0, services = 0;
    if (!(in >> f >> users >> services) || f == 0) throw DataError("malformed factor dump header");
    const Shape shape{users, services, f};
    std::vector<double> values(shape.size());
    std::string token;
    for (double& v : values) {
        if (!(in >> token)) throw DataError("factor dump truncated");
        const auto parsed = parse_double(token);
        if (!parsed) throw DataError("malformed factor value '" + token + "'");
        v = *parsed;
    }
    if (in >> token) throw DataError("trailing data after factor dump");
    return FactorState(ParamVector(shape, std::move(values)));
}

void save_factors(const FactorState& x, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    write_factors(x, out);
    if (!out) throw DataError("write failure on '" + path.string() + "'");
}

FactorState load_factors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
    return read_factors(in);
}

}  // namespace drslf
