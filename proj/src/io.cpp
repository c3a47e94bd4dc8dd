#include "behavior_metrics/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "behavior_metrics/errors.hpp"

namespace bmetrics {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        return std::nullopt;
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::optional<std::vector<double>> parse_row(std::string_view line) {
    std::vector<double> row;
    for (auto field : split(line, ',')) {
        auto v = parse_double(field);
        if (!v) {
            return std::nullopt;
        }
        row.push_back(*v);
    }
    return row;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ParseError("cannot open " + path.string());
    }
    return is;
}

} // namespace

std::string format_roundtrip(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_console(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

Trajectory read_trajectory_csv(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_allowed = true;
    std::size_t header_fields = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto content = trim(line);
        if (content.empty()) {
            continue;
        }
        auto row = parse_row(content);
        if (!row) {
            if (header_allowed) {
                header_allowed = false;
                header_fields = split(content, ',').size();
                continue;
            }
            throw ParseError("trajectory csv: line " + std::to_string(line_no) +
                             " is not a row of numbers");
        }
        header_allowed = false;
        if (!rows.empty() && row->size() != rows.front().size()) {
            throw ParseError("trajectory csv: line " + std::to_string(line_no) + " has " +
                             std::to_string(row->size()) + " fields, expected " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(*row));
    }
    if (rows.empty()) {
        throw ParseError("trajectory csv: no samples");
    }
    const auto q = static_cast<Eigen::Index>(rows.front().size());
    if (header_fields != 0 && header_fields != rows.front().size()) {
        throw ParseError("trajectory csv: header has " + std::to_string(header_fields) +
                         " fields but rows have " + std::to_string(q));
    }
    Matrix samples(q, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (Eigen::Index i = 0; i < q; ++i) {
            samples(i, static_cast<Eigen::Index>(t)) = rows[t][static_cast<std::size_t>(i)];
        }
    }
    try {
        return Trajectory(q, std::move(samples));
    } catch (const InvalidInput& e) {
        throw ParseError(std::string("trajectory csv: ") + e.what());
    }
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    auto is = open_input(path);
    try {
        return read_trajectory_csv(is);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& w) {
    for (Eigen::Index i = 0; i < w.q(); ++i) {
        os << (i ? "," : "") << 'v' << (i + 1);
    }
    os << '\n';
    for (Eigen::Index t = 0; t < w.length(); ++t) {
        for (Eigen::Index i = 0; i < w.q(); ++i) {
            os << (i ? "," : "") << format_roundtrip(w.samples()(i, t));
        }
        os << '\n';
    }
}

KernelRep read_kernel(std::istream& is) {
    std::vector<double> numbers;
    std::string line;
    while (std::getline(is, line)) {
        const auto content = trim(line);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        std::istringstream fields{std::string(content)};
        std::string tok;
        while (fields >> tok) {
            auto v = parse_double(tok);
            if (!v) {
                throw ParseError("kernel file: '" + tok + "' is not a number");
            }
            numbers.push_back(*v);
        }
    }
    if (numbers.size() < 3) {
        throw ParseError("kernel file: missing 'p q ell' header");
    }
    auto as_count = [](double x, const char* what) {
        if (x < 0 || x != static_cast<double>(static_cast<long long>(x))) {
            throw ParseError(std::string("kernel file: ") + what + " must be a non-negative integer");
        }
        return static_cast<Eigen::Index>(x);
    };
    const Eigen::Index p = as_count(numbers[0], "p");
    const Eigen::Index q = as_count(numbers[1], "q");
    const Eigen::Index ell = as_count(numbers[2], "ell");
    const std::size_t expected = 3 + static_cast<std::size_t>(p * q * (ell + 1));
    if (numbers.size() != expected) {
        throw ParseError("kernel file: expected " + std::to_string(expected - 3) +
                         " coefficients, found " + std::to_string(numbers.size() - 3));
    }
    std::vector<Matrix> coeffs;
    std::size_t at = 3;
    for (Eigen::Index k = 0; k <= ell; ++k) {
        Matrix r(p, q);
        for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = 0; j < q; ++j) {
                r(i, j) = numbers[at++];
            }
        }
        coeffs.push_back(std::move(r));
    }
    try {
        return KernelRep(std::move(coeffs));
    } catch (const InvalidInput& e) {
        throw ParseError(std::string("kernel file: ") + e.what());
    }
}

KernelRep read_kernel(const std::filesystem::path& path) {
    auto is = open_input(path);
    try {
        return read_kernel(is);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_kernel(std::ostream& os, const KernelRep& r) {
    os << r.p() << ' ' << r.q() << ' ' << r.degree() << '\n';
    for (const auto& c : r.coeffs()) {
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            for (Eigen::Index j = 0; j < c.cols(); ++j) {
                os << (j ? " " : "") << format_roundtrip(c(i, j));
            }
            os << '\n';
        }
    }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw Error("cannot write " + tmp.string());
        }
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!os) {
            throw Error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace bmetrics
