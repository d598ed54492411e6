#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tspga::io {

enum class WeightKind { Euc2d, Att, Explicit };

inline std::string_view to_string(WeightKind kind) {
    switch (kind) {
        case WeightKind::Euc2d: return "EUC_2D";
        case WeightKind::Att: return "ATT";
        case WeightKind::Explicit: return "EXPLICIT";
    }
    return "?";
}

/// Raised on malformed instance or tour text; line is 1-based.
struct ParseError : std::runtime_error {
    ParseError(int line_no, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + message),
          line(line_no) {}
    int line;
};

/// Raised when a file cannot be read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// TSPLIB nearest-integer rounding, nint(x) = (int)(x + 0.5).
inline int nint(double x) { return static_cast<int>(x + 0.5); }

inline int euc2d_distance(double x1, double y1, double x2, double y2) {
    const double dx = x1 - x2;
    const double dy = y1 - y2;
    return nint(std::sqrt(dx * dx + dy * dy));
}

/// TSPLIB pseudo-Euclidean distance.
inline int att_distance(double x1, double y1, double x2, double y2) {
    const double dx = x1 - x2;
    const double dy = y1 - y2;
    const double r = std::sqrt((dx * dx + dy * dy) / 10.0);
    const int t = nint(r);
    return t < r ? t + 1 : t;
}

/// A symmetric TSP instance. Immutable after construction; the full distance
/// table is precomputed, so memory is O(n^2) and distance() is a lookup.
class TspInstance {
  public:
    static TspInstance from_coords(std::string name, WeightKind kind,
                                   std::vector<std::pair<double, double>> coords) {
        if (kind == WeightKind::Explicit)
            throw std::invalid_argument("EXPLICIT instances take a matrix, not coordinates");
        const int n = static_cast<int>(coords.size());
        if (n < 3) throw std::invalid_argument("instance needs at least 3 cities");
        TspInstance inst;
        inst.name_ = std::move(name);
        inst.kind_ = kind;
        inst.coords_ = std::move(coords);
        inst.n_ = n;
        inst.dist_.assign(static_cast<std::size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const auto& [xi, yi] = inst.coords_[i];
                const auto& [xj, yj] = inst.coords_[j];
                const int d = kind == WeightKind::Euc2d ? euc2d_distance(xi, yi, xj, yj)
                                                        : att_distance(xi, yi, xj, yj);
                inst.dist_[static_cast<std::size_t>(i) * n + j] = d;
                inst.dist_[static_cast<std::size_t>(j) * n + i] = d;
            }
        }
        return inst;
    }

    /// matrix must be square with zero diagonal, symmetric and non-negative.
    static TspInstance from_matrix(std::string name,
                                   const std::vector<std::vector<int>>& matrix) {
        const int n = static_cast<int>(matrix.size());
        if (n < 3) throw std::invalid_argument("instance needs at least 3 cities");
        TspInstance inst;
        inst.name_ = std::move(name);
        inst.kind_ = WeightKind::Explicit;
        inst.n_ = n;
        inst.dist_.assign(static_cast<std::size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(matrix[i].size()) != n)
                throw std::invalid_argument("distance matrix is not square");
            for (int j = 0; j < n; ++j) {
                const int d = matrix[i][j];
                if (d < 0) throw std::invalid_argument("negative distance in matrix");
                if (i == j && d != 0)
                    throw std::invalid_argument("distance matrix diagonal must be zero");
                if (matrix[j][i] != d)
                    throw std::invalid_argument("distance matrix is not symmetric");
                inst.dist_[static_cast<std::size_t>(i) * n + j] = d;
            }
        }
        return inst;
    }

    const std::string& name() const { return name_; }
    int n() const { return n_; }
    WeightKind weight_kind() const { return kind_; }

    /// City coordinates; empty for EXPLICIT instances.
    const std::vector<std::pair<double, double>>& coords() const { return coords_; }

    int distance(int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_)
            throw std::out_of_range("city index out of range");
        return dist_[static_cast<std::size_t>(i) * n_ + j];
    }

  private:
    TspInstance() = default;

    std::string name_;
    WeightKind kind_ = WeightKind::Euc2d;
    int n_ = 0;
    std::vector<std::pair<double, double>> coords_;
    std::vector<int> dist_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

/// Splits "KEY : VALUE" (colon optional for bare section keywords).
inline std::pair<std::string, std::string> split_header(std::string_view line) {
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) return {std::string(trim(line)), ""};
    return {std::string(trim(line.substr(0, colon))), std::string(trim(line.substr(colon + 1)))};
}

inline bool parse_double(std::string_view token, double& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

inline bool parse_int(std::string_view token, long long& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

struct Line {
    int number;
    std::string_view text;
};

inline std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    int number = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        lines.push_back({number, trim(text.substr(pos, nl - pos))});
        pos = nl + 1;
        ++number;
    }
    return lines;
}

inline std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        if (pos > start) out.push_back(line.substr(start, pos - start));
    }
    return out;
}

}  // namespace detail

/// Parses a TSPLIB instance from full file contents. Supported weight kinds:
/// EUC_2D and ATT with NODE_COORD_SECTION, EXPLICIT with EDGE_WEIGHT_FORMAT
/// FULL_MATRIX, UPPER_ROW or LOWER_DIAG_ROW. City indices are 0-based
/// internally; file numbering is 1-based.
inline TspInstance parse_instance(const std::string& text) {
    using detail::Line;

    const auto lines = detail::split_lines(text);
    std::string name;
    std::string weight_type;
    std::string weight_format;
    long long dimension = -1;

    std::vector<std::pair<double, double>> coords;
    std::vector<bool> coord_seen;
    std::vector<long long> weights;
    int weight_section_line = 0;

    std::size_t li = 0;
    const auto at_end = [&] { return li >= lines.size(); };
    const auto current = [&]() -> const Line& { return lines[li]; };

    // Header part.
    bool saw_coord_section = false;
    bool saw_weight_section = false;
    while (!at_end()) {
        const Line& line = current();
        if (line.text.empty()) {
            ++li;
            continue;
        }
        auto [key, value] = detail::split_header(line.text);
        if (key == "EOF") {
            ++li;
            break;
        }
        if (key == "NAME") {
            name = value;
        } else if (key == "TYPE") {
            if (value != "TSP")
                throw ParseError(line.number, "unsupported TYPE '" + value + "' (want TSP)");
        } else if (key == "COMMENT" || key == "DISPLAY_DATA_TYPE") {
            // ignored
        } else if (key == "DIMENSION") {
            if (!detail::parse_int(value, dimension) || dimension < 3)
                throw ParseError(line.number, "bad DIMENSION '" + value + "'");
        } else if (key == "EDGE_WEIGHT_TYPE") {
            weight_type = value;
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            weight_format = value;
        } else if (key == "NODE_COORD_SECTION") {
            if (dimension < 0) throw ParseError(line.number, "NODE_COORD_SECTION before DIMENSION");
            saw_coord_section = true;
            coords.assign(static_cast<std::size_t>(dimension), {0.0, 0.0});
            coord_seen.assign(static_cast<std::size_t>(dimension), false);
            ++li;
            for (long long k = 0; k < dimension; ++k) {
                while (!at_end() && current().text.empty()) ++li;
                if (at_end() || current().text == "EOF")
                    throw ParseError(at_end() ? lines.back().number : current().number,
                                     "NODE_COORD_SECTION has " + std::to_string(k) +
                                         " lines, DIMENSION is " + std::to_string(dimension));
                const Line& row = current();
                const auto toks = detail::tokens(row.text);
                long long id;
                double x, y;
                if (toks.size() != 3 || !detail::parse_int(toks[0], id) ||
                    !detail::parse_double(toks[1], x) || !detail::parse_double(toks[2], y))
                    throw ParseError(row.number, "malformed coordinate line");
                if (id < 1 || id > dimension)
                    throw ParseError(row.number, "city id " + std::to_string(id) +
                                                     " outside 1.." + std::to_string(dimension));
                if (coord_seen[static_cast<std::size_t>(id - 1)])
                    throw ParseError(row.number, "duplicate city id " + std::to_string(id));
                coord_seen[static_cast<std::size_t>(id - 1)] = true;
                coords[static_cast<std::size_t>(id - 1)] = {x, y};
                ++li;
            }
            continue;
        } else if (key == "EDGE_WEIGHT_SECTION") {
            if (dimension < 0) throw ParseError(line.number, "EDGE_WEIGHT_SECTION before DIMENSION");
            saw_weight_section = true;
            weight_section_line = line.number;
            ++li;
            while (!at_end() && current().text != "EOF" &&
                   current().text.find_first_not_of(" \t0123456789+-") == std::string_view::npos) {
                const Line& row = current();
                if (row.text.empty()) {
                    ++li;
                    continue;
                }
                for (const auto tok : detail::tokens(row.text)) {
                    long long w;
                    if (!detail::parse_int(tok, w))
                        throw ParseError(row.number, "non-numeric weight token '" + std::string(tok) + "'");
                    weights.push_back(w);
                }
                ++li;
            }
            continue;
        } else {
            throw ParseError(line.number, "unsupported keyword or section '" + key + "'");
        }
        ++li;
    }

    if (dimension < 0) throw ParseError(1, "missing DIMENSION");
    if (weight_type.empty()) throw ParseError(1, "missing EDGE_WEIGHT_TYPE");
    const int n = static_cast<int>(dimension);

    if (weight_type == "EUC_2D" || weight_type == "ATT") {
        if (!saw_coord_section) throw ParseError(1, "missing NODE_COORD_SECTION");
        if (saw_weight_section)
            throw ParseError(weight_section_line, "EDGE_WEIGHT_SECTION not allowed with " + weight_type);
        const auto kind = weight_type == "EUC_2D" ? WeightKind::Euc2d : WeightKind::Att;
        return TspInstance::from_coords(std::move(name), kind, std::move(coords));
    }
    if (weight_type != "EXPLICIT")
        throw ParseError(1, "unsupported EDGE_WEIGHT_TYPE '" + weight_type + "'");
    if (!saw_weight_section) throw ParseError(1, "missing EDGE_WEIGHT_SECTION");

    std::vector<std::vector<int>> matrix(n, std::vector<int>(n, 0));
    const auto expect = [&](std::size_t want) {
        if (weights.size() != want)
            throw ParseError(weight_section_line,
                             "EDGE_WEIGHT_SECTION has " + std::to_string(weights.size()) +
                                 " entries, expected " + std::to_string(want));
    };
    std::size_t k = 0;
    if (weight_format == "FULL_MATRIX") {
        expect(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) matrix[i][j] = static_cast<int>(weights[k++]);
    } else if (weight_format == "UPPER_ROW") {
        expect(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                matrix[i][j] = matrix[j][i] = static_cast<int>(weights[k++]);
            }
    } else if (weight_format == "LOWER_DIAG_ROW") {
        expect(static_cast<std::size_t>(n) * (n + 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                matrix[i][j] = matrix[j][i] = static_cast<int>(weights[k++]);
            }
    } else {
        throw ParseError(1, "unsupported EDGE_WEIGHT_FORMAT '" + weight_format + "'");
    }
    try {
        return TspInstance::from_matrix(std::move(name), matrix);
    } catch (const std::invalid_argument& e) {
        throw ParseError(weight_section_line, e.what());
    }
}

/// The built-in 9-city EXPLICIT instance used throughout the test suite,
/// addressable from the CLI as ":figure2".
inline TspInstance figure2_instance() {
    // Upper-triangle rows for cities 1..9.
    static const std::vector<std::vector<int>> upper = {
        {2, 8, 5, 20, 6, 25, 30, 4},
        {5, 3, 15, 8, 52, 21, 12},
        {27, 6, 10, 20, 14, 7},
        {8, 4, 17, 60, 2},
        {22, 6, 8, 5},
        {15, 6, 8},
        {10, 9},
        {30},
    };
    std::vector<std::vector<int>> matrix(9, std::vector<int>(9, 0));
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 9; ++j)
            matrix[i][j] = matrix[j][i] = upper[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i - 1)];
    return TspInstance::from_matrix("figure2", matrix);
}

/// Reads an instance from a file path; ":figure2" resolves to the built-in
/// instance. Throws IoError if the file cannot be read, ParseError if it
/// cannot be parsed.
inline TspInstance load_instance(const std::string& path) {
    if (path == ":figure2") return figure2_instance();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

/// Serializes a tour (0-based city order) in TSPLIB .tour format.
inline std::string write_tour(const std::vector<int>& tour, const std::string& name) {
    std::ostringstream out;
    out << "NAME : " << name << "\n";
    out << "TYPE : TOUR\n";
    out << "DIMENSION : " << tour.size() << "\n";
    out << "TOUR_SECTION\n";
    for (const int city : tour) out << city + 1 << "\n";
    out << "-1\n";
    out << "EOF\n";
    return out.str();
}

/// Parses a TSPLIB .tour file; returns the 0-based city order.
inline std::vector<int> parse_tour(const std::string& text) {
    const auto lines = detail::split_lines(text);
    std::vector<int> tour;
    bool in_section = false;
    bool terminated = false;
    for (const auto& line : lines) {
        if (line.text.empty()) continue;
        if (!in_section) {
            auto [key, value] = detail::split_header(line.text);
            if (key == "TOUR_SECTION") in_section = true;
            else if (key == "EOF") break;
            // other header keys ignored
            continue;
        }
        if (terminated) {
            if (line.text == "EOF") continue;
            throw ParseError(line.number, "content after tour terminator");
        }
        for (const auto tok : detail::tokens(line.text)) {
            long long id;
            if (!detail::parse_int(tok, id))
                throw ParseError(line.number, "non-numeric tour entry '" + std::string(tok) + "'");
            if (id == -1) {
                terminated = true;
                break;
            }
            if (id < 1) throw ParseError(line.number, "tour entries are 1-based");
            tour.push_back(static_cast<int>(id - 1));
        }
    }
    if (!in_section) throw ParseError(1, "missing TOUR_SECTION");
    if (tour.empty()) throw ParseError(1, "empty tour");
    return tour;
}

}  // namespace tspga::io
