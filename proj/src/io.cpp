#include "pfkrylov/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace pfk {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& context) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') {
        throw InputError("cannot parse number '" + text + "' in " + context);
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF endings everywhere
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

Complex parse_complex(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) throw InputError("empty complex literal");
    // Split at the last '+'/'-' that is not a leading sign or an exponent sign.
    std::size_t pos = std::string::npos;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            pos = i;
        }
    }
    auto parse_imag = [](std::string part) -> double {
        part = trim(part);
        if (part == "+" || part.empty()) return 1.0;
        if (part == "-") return -1.0;
        return parse_double(part, "complex literal");
    };
    if (t.back() == 'i' || t.back() == 'I') {
        t.pop_back();
        if (pos == std::string::npos) {
            return Complex{0.0, parse_imag(t)};
        }
        return Complex{parse_double(t.substr(0, pos), "complex literal"),
                       parse_imag(t.substr(pos))};
    }
    return Complex{parse_double(t, "complex literal"), 0.0};
}

std::string format_complex(Complex z) {
    std::string out = format_double(z.real());
    out += z.imag() < 0.0 ? "-" : "+";
    out += format_double(std::abs(z.imag()));
    out += "i";
    return out;
}

Series read_series_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
    const std::size_t dim = split(trim(line), ',').size();
    Series out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> cells = split(t, ',');
        if (cells.size() != dim) {
            throw InputError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                             std::to_string(dim) + " columns, got " +
                             std::to_string(cells.size()));
        }
        StateVector v(static_cast<Eigen::Index>(dim));
        for (std::size_t j = 0; j < dim; ++j) {
            v(static_cast<Eigen::Index>(j)) =
                parse_double(cells[j], path + " line " + std::to_string(lineno));
            if (!std::isfinite(v(static_cast<Eigen::Index>(j)))) {
                throw InputError("'" + path + "' line " + std::to_string(lineno) +
                                 ": non-finite entry");
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<double> read_scalar_csv(const std::string& path) {
    const Series s = read_series_csv(path);
    std::vector<double> out;
    out.reserve(s.size());
    for (const StateVector& v : s) {
        if (v.size() != 1) {
            throw InputError("'" + path + "' has " + std::to_string(v.size()) +
                             " columns; expected a single scalar column");
        }
        out.push_back(v(0));
    }
    return out;
}

void write_scalar_csv(const std::string& path, std::span<const double> values) {
    std::ofstream out = open_output(path);
    out << "value\n";
    for (double v : values) out << format_double(v) << "\n";
}

void write_trace_csv(const std::string& path, const AbnormalityTrace& trace) {
    std::ofstream out = open_output(path);
    out << "t,score,denominator,flag\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << trace.t[i] << "," << format_double(trace.score[i]) << ","
            << format_double(trace.denominator[i]) << ","
            << (trace.degenerate[i] ? "degenerate" : "ok") << "\n";
    }
}

AbnormalityTrace read_trace_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
    AbnormalityTrace trace;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> cells = split(t, ',');
        if (cells.size() != 4) {
            throw InputError("'" + path + "' line " + std::to_string(lineno) +
                             ": expected t,score,denominator,flag");
        }
        trace.t.push_back(
            static_cast<int>(parse_double(cells[0], path + " line " + std::to_string(lineno))));
        trace.score.push_back(parse_double(cells[1], path));
        trace.denominator.push_back(parse_double(cells[2], path));
        const std::string flag = trim(cells[3]);
        if (flag != "ok" && flag != "degenerate") {
            throw InputError("'" + path + "' line " + std::to_string(lineno) +
                             ": unknown flag '" + flag + "'");
        }
        trace.degenerate.push_back(flag == "degenerate" ? 1 : 0);
    }
    return trace;
}

std::vector<LabelInterval> read_labels_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
    std::vector<LabelInterval> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> cells = split(t, ',');
        if (cells.size() != 2) {
            throw InputError("'" + path + "' line " + std::to_string(lineno) +
                             ": expected start,end");
        }
        LabelInterval iv;
        iv.start = static_cast<int>(parse_double(cells[0], path));
        iv.end = static_cast<int>(parse_double(cells[1], path));
        if (iv.end < iv.start) {
            throw InputError("'" + path + "' line " + std::to_string(lineno) +
                             ": interval end precedes start");
        }
        out.push_back(iv);
    }
    return out;
}

void write_labels_csv(const std::string& path, std::span<const LabelInterval> labels) {
    std::ofstream out = open_output(path);
    out << "start,end\n";
    for (const LabelInterval& iv : labels) out << iv.start << "," << iv.end << "\n";
}

std::map<std::string, std::string> read_config_kv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw InputError("'" + path + "' line " + std::to_string(lineno) +
                             ": expected key=value");
        }
        out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

}  // namespace pfk
