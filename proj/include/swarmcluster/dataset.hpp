#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "swarmcluster/bounds.hpp"
#include "swarmcluster/matrix.hpp"

namespace swarmcluster {

/// n x d feature matrix with optional dense class labels (0..C-1).
struct Dataset {
    Matrix points;
    std::optional<std::vector<int>> labels;
    std::optional<std::vector<std::string>> feature_names;

    std::size_t size() const { return points.rows; }
    std::size_t dim() const { return points.cols; }

    int num_classes() const {
        if (!labels) return 0;
        int c = 0;
        for (int l : *labels) c = std::max(c, l + 1);
        return c;
    }

    void validate() const {
        if (points.rows == 0 || points.cols == 0)
            throw std::invalid_argument("Dataset: empty");
        for (double v : points.data)
            if (!std::isfinite(v))
                throw std::invalid_argument("Dataset: non-finite feature value");
        if (labels && labels->size() != points.rows)
            throw std::invalid_argument("Dataset: label count != row count");
        if (labels)
            for (int l : *labels)
                if (l < 0) throw std::invalid_argument("Dataset: negative label id");
    }
};

/// Published metadata of a benchmark dataset, used to validate loaded files.
struct DatasetDescriptor {
    std::string name;
    std::size_t n_instances = 0;
    std::size_t n_dimensions = 0;
    std::size_t n_classes = 0;
    std::vector<std::size_t> class_sizes;
};

/// Per-dimension affine map recorded by min_max_normalize so centers can be
/// mapped back to original feature units.
struct NormalizationParams {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dim() const { return min.size(); }
};

struct CsvSchema {
    char delimiter = ',';
    bool has_header = false;
    std::optional<std::size_t> label_column;

    bool operator==(const CsvSchema&) const = default;
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline bool parse_finite_double(const std::string& field, double& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) return false;
    return std::isfinite(out);
}

}  // namespace detail

/// Load a delimiter-separated file. Label strings (if a label column is
/// given) are mapped to dense ids 0..C-1 in first-appearance order.
/// Parse failures name the offending data row and column (1-based).
inline Dataset load_csv(const std::string& path, const CsvSchema& schema = {}) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_csv: cannot open '" + path + "'");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;  // blank lines carry no row
        lines.push_back(line);
    }
    if (in.bad())
        throw std::runtime_error("load_csv: I/O error reading '" + path + "'");

    std::optional<std::vector<std::string>> header;
    std::size_t first_data = 0;
    if (schema.has_header) {
        if (lines.empty())
            throw std::runtime_error("load_csv: '" + path + "' has no header row");
        header = detail::split_fields(lines[0], schema.delimiter);
        first_data = 1;
    }
    if (lines.size() <= first_data)
        throw std::runtime_error("load_csv: '" + path + "' contains no data rows");

    const std::size_t width = detail::split_fields(lines[first_data], schema.delimiter).size();
    if (schema.label_column && *schema.label_column >= width)
        throw std::runtime_error("load_csv: label column " +
                                 std::to_string(*schema.label_column) +
                                 " out of range for width " + std::to_string(width));
    const std::size_t d = schema.label_column ? width - 1 : width;
    if (d == 0)
        throw std::runtime_error("load_csv: no feature columns left in '" + path + "'");

    Dataset ds;
    ds.points = Matrix(lines.size() - first_data, d);
    std::vector<int> labels;
    std::unordered_map<std::string, int> label_ids;

    for (std::size_t r = 0; r < ds.points.rows; ++r) {
        const auto fields = detail::split_fields(lines[first_data + r], schema.delimiter);
        if (fields.size() != width) {
            std::ostringstream msg;
            msg << "load_csv: ragged row " << r + 1 << " in '" << path << "' ("
                << fields.size() << " fields, expected " << width << ")";
            throw std::runtime_error(msg.str());
        }
        std::size_t j = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (schema.label_column && c == *schema.label_column) {
                const std::string key = detail::trim(fields[c]);
                auto [it, inserted] =
                    label_ids.emplace(key, static_cast<int>(label_ids.size()));
                labels.push_back(it->second);
                (void)inserted;
                continue;
            }
            double v;
            if (!detail::parse_finite_double(fields[c], v)) {
                std::ostringstream msg;
                msg << "load_csv: cannot parse '" << detail::trim(fields[c])
                    << "' as a finite real at row " << r + 1 << ", column " << c + 1
                    << " of '" << path << "'";
                throw std::runtime_error(msg.str());
            }
            ds.points(r, j++) = v;
        }
    }

    if (schema.label_column) ds.labels = std::move(labels);
    if (header) {
        std::vector<std::string> names;
        for (std::size_t c = 0; c < width; ++c) {
            if (schema.label_column && c == *schema.label_column) continue;
            names.push_back(detail::trim((*header)[c]));
        }
        ds.feature_names = std::move(names);
    }
    ds.validate();
    return ds;
}

/// Rescale every column to [0,1]. Constant columns map to all-zeros so the
/// result stays finite. Returned params invert the map for non-constant
/// columns; constant ones map back to their original value.
inline std::pair<Dataset, NormalizationParams> min_max_normalize(const Dataset& ds) {
    ds.validate();
    const std::size_t n = ds.size(), d = ds.dim();
    std::pair<Dataset, NormalizationParams> result;
    Dataset& out = result.first;
    NormalizationParams& params = result.second;
    params.min.assign(d, 0.0);
    params.max.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double lo = ds.points(0, j), hi = ds.points(0, j);
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, ds.points(i, j));
            hi = std::max(hi, ds.points(i, j));
        }
        params.min[j] = lo;
        params.max[j] = hi;
    }
    out = ds;
    for (std::size_t j = 0; j < d; ++j) {
        const double range = params.max[j] - params.min[j];
        for (std::size_t i = 0; i < n; ++i)
            out.points(i, j) = range > 0.0 ? (ds.points(i, j) - params.min[j]) / range : 0.0;
    }
    return result;
}

/// Inverse of the min-max map, applied to a K x d center matrix.
inline Matrix denormalize_centers(const Matrix& centers, const NormalizationParams& params) {
    if (centers.cols != params.dim())
        throw std::invalid_argument("denormalize_centers: dimension mismatch");
    Matrix out = centers;
    for (std::size_t i = 0; i < centers.rows; ++i)
        for (std::size_t j = 0; j < centers.cols; ++j)
            out(i, j) = centers(i, j) * (params.max[j] - params.min[j]) + params.min[j];
    return out;
}

/// Componentwise data min/max; every point lies inside the returned box.
inline Bounds dataset_bounds(const Dataset& ds) {
    ds.validate();
    Bounds b;
    b.lower.assign(ds.dim(), 0.0);
    b.upper.assign(ds.dim(), 0.0);
    for (std::size_t j = 0; j < ds.dim(); ++j) {
        double lo = ds.points(0, j), hi = ds.points(0, j);
        for (std::size_t i = 1; i < ds.size(); ++i) {
            lo = std::min(lo, ds.points(i, j));
            hi = std::max(hi, ds.points(i, j));
        }
        b.lower[j] = lo;
        b.upper[j] = hi;
    }
    return b;
}

/// Published (n, d, C, class sizes) for the five bundled benchmark datasets.
inline DatasetDescriptor builtin_descriptor(const std::string& name) {
    if (name == "cmc") return {"cmc", 1473, 9, 3, {629, 334, 510}};
    if (name == "glass") return {"glass", 214, 9, 6, {70, 17, 76, 13, 9, 29}};
    if (name == "iris") return {"iris", 150, 4, 3, {50, 50, 50}};
    if (name == "pima") return {"pima", 768, 8, 2, {500, 268}};
    if (name == "wine") return {"wine", 178, 13, 3, {59, 71, 48}};
    throw std::invalid_argument("builtin_descriptor: unknown dataset '" + name + "'");
}

}  // namespace swarmcluster
