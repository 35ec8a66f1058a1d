#include "darkmass/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace darkmass {

namespace {

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line_no,
                    const std::string& column, bool allow_neg_inf = false) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": column '" + column +
                                 "': not a number: '" + s + "'");
    if (!std::isfinite(v) && !(allow_neg_inf && v == -std::numeric_limits<double>::infinity()))
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": column '" + column +
                                 "': non-finite value");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    // round-trip precision; %.17g always parses back to the same bits
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

ObservationSet load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_catalog: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("load_catalog: '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_csv(line);
    int ix1 = -1, ix2 = -1, iv3 = -1, isigma = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "x1") ix1 = static_cast<int>(c);
        else if (header[c] == "x2") ix2 = static_cast<int>(c);
        else if (header[c] == "v3") iv3 = static_cast<int>(c);
        else if (header[c] == "sigma_v3") isigma = static_cast<int>(c);
        else
            throw std::runtime_error("load_catalog: '" + path + "': unknown column '" +
                                     header[c] + "' (expected x1,x2,v3[,sigma_v3])");
    }
    if (ix1 < 0 || ix2 < 0 || iv3 < 0)
        throw std::runtime_error("load_catalog: '" + path +
                                 "': missing required columns x1,x2,v3");

    ObservationSet data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        Observation obs;
        obs.x1 = parse_double(fields[ix1], path, line_no, "x1");
        obs.x2 = parse_double(fields[ix2], path, line_no, "x2");
        obs.v3 = parse_double(fields[iv3], path, line_no, "v3");
        if (isigma >= 0) {
            const double s = parse_double(fields[isigma], path, line_no, "sigma_v3");
            if (s < 0.0)
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": negative sigma_v3");
            obs.sigma_v3 = s;
        }
        data.push_back(obs);
    }
    if (data.empty())
        throw std::runtime_error("load_catalog: '" + path + "' contains no data rows");
    return data;
}

void save_catalog(const ObservationSet& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_catalog: cannot open '" + path + "'");
    const bool with_sigma =
        std::any_of(data.begin(), data.end(), [](const Observation& o) { return bool(o.sigma_v3); });
    out << (with_sigma ? "x1,x2,v3,sigma_v3\n" : "x1,x2,v3\n");
    for (const auto& o : data) {
        out << format_double(o.x1) << ',' << format_double(o.x2) << ',' << format_double(o.v3);
        if (with_sigma) out << ',' << format_double(o.sigma_v3 ? *o.sigma_v3 : 0.0);
        out << '\n';
    }
}

void save_chain_csv(const Chain& chain, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_chain_csv: cannot open '" + path + "'");
    out << "iteration";
    for (std::size_t i = 0; i < chain.n_rho; ++i) out << ",rho_" << (i + 1);
    for (std::size_t j = 0; j < chain.n_f; ++j) out << ",f_" << (j + 1);
    out << ",log_post\n";
    for (const auto& s : chain.samples) {
        out << s.iteration;
        for (double v : s.rho) out << ',' << format_double(v);
        for (double v : s.f) out << ',' << format_double(v);
        out << ',' << format_double(s.log_post) << '\n';
    }
}

Chain load_chain_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_chain_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_chain_csv: '" + path + "' empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    if (header.size() < 3 || header.front() != "iteration" || header.back() != "log_post")
        throw std::runtime_error("load_chain_csv: '" + path + "': unexpected header");

    Chain chain;
    for (const auto& name : header) {
        if (name.rfind("rho_", 0) == 0) ++chain.n_rho;
        if (name.rfind("f_", 0) == 0) ++chain.n_f;
    }
    if (chain.n_rho + chain.n_f + 2 != header.size())
        throw std::runtime_error("load_chain_csv: '" + path + "': unexpected header");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad field count");
        ChainSample s;
        s.iteration = static_cast<std::uint64_t>(
            parse_double(fields[0], path, line_no, "iteration"));
        for (std::size_t i = 0; i < chain.n_rho; ++i)
            s.rho.push_back(parse_double(fields[1 + i], path, line_no, header[1 + i]));
        for (std::size_t j = 0; j < chain.n_f; ++j)
            s.f.push_back(
                parse_double(fields[1 + chain.n_rho + j], path, line_no, header[1 + chain.n_rho + j]));
        s.log_post = parse_double(fields.back(), path, line_no, "log_post", true);
        chain.samples.push_back(std::move(s));
    }
    return chain;
}

}  // namespace darkmass
