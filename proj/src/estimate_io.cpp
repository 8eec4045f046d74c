#include "pfkrylov/estimate_io.hpp"

#include <fstream>
#include <sstream>

#include "pfkrylov/io.hpp"
#include "pfkrylov/systems.hpp"

namespace pfk {

namespace {

constexpr const char* kMagic = "pfkrylov-estimate";
constexpr int kVersion = 1;

void write_matrix(std::ofstream& out, const char* name, const Eigen::MatrixXcd& m) {
    out << "matrix " << name << " " << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << " ";
            out << format_double(m(i, j).real()) << "," << format_double(m(i, j).imag());
        }
        out << "\n";
    }
}

Eigen::MatrixXcd read_matrix(std::ifstream& in, const std::string& path, int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    std::string line;
    for (int i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) {
            throw InputError("'" + path + "': truncated matrix block");
        }
        std::istringstream ls(line);
        std::string cell;
        for (int j = 0; j < cols; ++j) {
            if (!(ls >> cell)) throw InputError("'" + path + "': short matrix row");
            const auto comma = cell.find(',');
            if (comma == std::string::npos) {
                throw InputError("'" + path + "': matrix entries must be re,im pairs");
            }
            m(i, j) = Complex{std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1))};
        }
    }
    return m;
}

}  // namespace

void save_estimate(const std::string& path, const OperatorEstimate& est,
                   const EstimateDataRef& ref) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << kMagic << " " << kVersion << "\n";
    out << "method " << (est.method == Method::Arnoldi ? "arnoldi" : "sia") << "\n";
    out << "kernel " << (est.spec.family == KernelFamily::Gaussian ? "gaussian" : "laplacian")
        << "\n";
    out << "bandwidth " << format_double(est.spec.bandwidth) << "\n";
    out << "s " << est.plan.S << "\n";
    out << "n " << est.plan.N << "\n";
    out << "normalize " << (est.plan.normalize ? 1 : 0) << "\n";
    out << "delay " << ref.delay << "\n";
    if (est.method == Method::ShiftInvert) {
        out << "gamma " << format_double(est.gamma.real()) << " "
            << format_double(est.gamma.imag()) << "\n";
        out << "cond_l " << format_double(est.cond_L) << "\n";
    }
    if (ref.embed_data) {
        const int dim = est.train.empty() ? 0 : static_cast<int>(est.train[0].size());
        out << "points " << est.train.size() << " " << dim << "\n";
        for (const StateVector& v : est.train) {
            for (Eigen::Index k = 0; k < v.size(); ++k) {
                if (k) out << " ";
                out << format_double(v(k));
            }
            out << "\n";
        }
    } else {
        out << "data " << ref.train_start << " " << ref.data_path << "\n";
    }
    write_matrix(out, "r", est.R);
    write_matrix(out, "k", est.Ktilde);
    if (est.method == Method::ShiftInvert) write_matrix(out, "l", est.Ltilde);
    out << "end\n";
}

LoadedEstimate load_estimate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open estimate file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
    {
        std::istringstream head(line);
        std::string magic;
        int version = 0;
        head >> magic >> version;
        if (magic != kMagic || version != kVersion) {
            throw InputError("'" + path + "' is not a version-" + std::to_string(kVersion) +
                             " estimate file");
        }
    }

    LoadedEstimate loaded;
    OperatorEstimate& est = loaded.est;
    std::string data_path;
    int train_start = 0;
    bool have_data_ref = false;
    KernelFamily family = KernelFamily::Gaussian;
    double bandwidth = 1.0;
    int S = 0, N = 0;
    bool normalize = true;

    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key.empty()) continue;
        if (key == "end") break;
        if (key == "method") {
            std::string m;
            ls >> m;
            if (m == "arnoldi") {
                est.method = Method::Arnoldi;
            } else if (m == "sia") {
                est.method = Method::ShiftInvert;
            } else {
                throw InputError("'" + path + "': unknown method '" + m + "'");
            }
        } else if (key == "kernel") {
            std::string k;
            ls >> k;
            if (k == "gaussian") {
                family = KernelFamily::Gaussian;
            } else if (k == "laplacian") {
                family = KernelFamily::Laplacian;
            } else {
                throw InputError("'" + path + "': unknown kernel '" + k + "'");
            }
        } else if (key == "bandwidth") {
            ls >> bandwidth;
        } else if (key == "s") {
            ls >> S;
        } else if (key == "n") {
            ls >> N;
        } else if (key == "normalize") {
            int v = 1;
            ls >> v;
            normalize = v != 0;
        } else if (key == "delay") {
            ls >> loaded.delay;
        } else if (key == "gamma") {
            double re = 0.0, im = 0.0;
            ls >> re >> im;
            est.gamma = Complex{re, im};
        } else if (key == "cond_l") {
            ls >> est.cond_L;
        } else if (key == "data") {
            ls >> train_start;
            std::getline(ls, data_path);
            data_path = data_path.empty() ? "" : data_path.substr(1);
            have_data_ref = true;
        } else if (key == "points") {
            std::size_t count = 0;
            int dim = 0;
            ls >> count >> dim;
            est.train.resize(count);
            std::string row;
            for (std::size_t i = 0; i < count; ++i) {
                if (!std::getline(in, row)) {
                    throw InputError("'" + path + "': truncated points block");
                }
                std::istringstream rs(row);
                StateVector v(dim);
                for (int k = 0; k < dim; ++k) {
                    if (!(rs >> v(k))) throw InputError("'" + path + "': short point row");
                }
                est.train[i] = std::move(v);
            }
        } else if (key == "matrix") {
            std::string name;
            int rows = 0, cols = 0;
            ls >> name >> rows >> cols;
            Eigen::MatrixXcd m = read_matrix(in, path, rows, cols);
            if (name == "r") {
                est.R = std::move(m);
            } else if (name == "k") {
                est.Ktilde = std::move(m);
            } else if (name == "l") {
                est.Ltilde = std::move(m);
            } else {
                throw InputError("'" + path + "': unknown matrix '" + name + "'");
            }
        } else {
            throw InputError("'" + path + "': unknown key '" + key + "'");
        }
    }

    if (S < 1 || N < 1) throw InputError("'" + path + "': missing s/n header");
    est.plan = EmbeddingPlan(S, N, normalize);
    est.spec = KernelSpec(family, bandwidth);
    if (est.R.rows() != S || est.Ktilde.rows() != S) {
        throw InputError("'" + path + "': matrix dimensions disagree with s");
    }
    if (est.method == Method::ShiftInvert) {
        est.weights = WeightScheme::build(est.gamma, S);
        if (est.Ltilde.rows() != S) throw InputError("'" + path + "': missing l matrix");
    }

    if (have_data_ref) {
        const Series raw = read_series_csv(data_path);
        Series embedded;
        if (!raw.empty() && raw[0].size() == 1) {
            std::vector<double> scalars(raw.size());
            for (std::size_t i = 0; i < raw.size(); ++i) scalars[i] = raw[i](0);
            embedded = delay_embed(scalars, loaded.delay);
        } else {
            if (loaded.delay != 1) {
                throw InputError("'" + path + "': delay embedding applies to scalar series only");
            }
            embedded = raw;
        }
        const int need = est.plan.min_series_length();
        if (train_start < 0 ||
            train_start + need > static_cast<int>(embedded.size())) {
            throw InputError("'" + data_path + "' no longer covers the training window [" +
                             std::to_string(train_start) + ", " +
                             std::to_string(train_start + need) + ")");
        }
        est.train.assign(embedded.begin() + train_start, embedded.begin() + train_start + need);
    } else if (est.train.empty()) {
        throw InputError("'" + path + "': neither data reference nor embedded points present");
    }
    return loaded;
}

}  // namespace pfk
