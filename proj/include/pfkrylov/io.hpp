#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pfkrylov/predictor.hpp"

namespace pfk {

// Doubles are serialized with 17 significant digits so that write-then-read
// is value-exact.
std::string format_double(double v);

// Parses "a+bi" / "a-bi" / plain "a" (also accepts a bare "bi" imaginary part).
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

// Series CSV: header row, one column per state dimension (single column
// named "value" for scalar series), LF line endings.
Series read_series_csv(const std::string& path);
std::vector<double> read_scalar_csv(const std::string& path);
void write_scalar_csv(const std::string& path, std::span<const double> values);

// Trace CSV: t,score,denominator,flag with flag in {ok, degenerate}.
void write_trace_csv(const std::string& path, const AbnormalityTrace& trace);
AbnormalityTrace read_trace_csv(const std::string& path);

// Labels CSV: start,end (inclusive indices of anomalous intervals).
struct LabelInterval {
    int start = 0;
    int end = 0;
};
std::vector<LabelInterval> read_labels_csv(const std::string& path);
void write_labels_csv(const std::string& path, std::span<const LabelInterval> labels);

// Flat key=value config file; '#' starts a comment line.
std::map<std::string, std::string> read_config_kv(const std::string& path);

}  // namespace pfk
