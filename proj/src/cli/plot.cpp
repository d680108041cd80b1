#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rabinovich/cli/commands.hpp"

namespace rabinovich::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto c = line.find(',', start);
        out.push_back(line.substr(start, c == std::string::npos ? std::string::npos : c - start));
        if (c == std::string::npos) break;
        start = c + 1;
    }
    return out;
}

TrajectoryTable parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Map the byte offset to a line number.
        const std::size_t at = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(at), '\n'));
        throw ParseError("line " + std::to_string(line) + ": malformed JSON", line);
    }
    if (!doc.is_object() || !doc.contains("data") || !doc["data"].is_object())
        throw ParseError("trajectory JSON lacks a 'data' object", 0);
    TrajectoryTable t;
    std::vector<std::string> order = {"t", "x1", "x2", "x3"};
    for (const auto& [k, v] : doc["data"].items())
        if (std::find(order.begin(), order.end(), k) == order.end()) order.push_back(k);
    for (const auto& name : order) {
        if (!doc["data"].contains(name)) throw ParseError("trajectory JSON lacks column '" + name + "'", 0);
        const auto& col = doc["data"][name];
        if (!col.is_array()) throw ParseError("column '" + name + "' is not an array", 0);
        std::vector<double> values;
        for (const auto& v : col) {
            if (!v.is_number()) throw ParseError("column '" + name + "' holds a non-number", 0);
            values.push_back(v.get<double>());
        }
        if (!t.data.empty() && values.size() != t.data.front().size())
            throw ParseError("column '" + name + "' has a different length", 0);
        t.columns.push_back(name);
        t.data.push_back(std::move(values));
    }
    return t;
}

}  // namespace

TrajectoryTable parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    TrajectoryTable t;
    if (!std::getline(in, line)) throw ParseError("line 1: empty file", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.columns = split_fields(line);
    if (t.columns.size() < 4 || t.columns[0] != "t" || t.columns[1] != "x1" || t.columns[2] != "x2" ||
        t.columns[3] != "x3")
        throw ParseError("line 1: header must start with t,x1,x2,x3", 1);
    t.data.resize(t.columns.size());
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != t.columns.size())
            throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                                 " fields, found " + std::to_string(fields.size()),
                             lineno);
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string& f = fields[c];
            double v = 0;
            const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || p != f.data() + f.size() || f.empty())
                throw ParseError("line " + std::to_string(lineno) + ": field '" + t.columns[c] + "' is not a number",
                                 lineno);
            t.data[c].push_back(v);
        }
    }
    return t;
}

TrajectoryTable read_trajectory(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open '" + path + "'", 0);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json(text);
    return parse_trajectory_csv(text);
}

namespace {

void check_pair(const TrajectoryTable& t, int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3) throw DomainError("pair: indices must lie in 1..3");
    if (t.rows() == 0) throw DomainError("trajectory has no rows");
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Enough digits that the two ends of an axis read differently.
std::string label(double x, double lo, double hi) {
    const double mag = std::max(std::abs(lo), std::abs(hi));
    int digits = 6;
    if (hi > lo && mag > 0) digits = std::clamp(static_cast<int>(std::ceil(std::log10(mag / (hi - lo)))) + 3, 6, 17);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

}  // namespace

std::string plot_csv(const TrajectoryTable& t, int i, int j) {
    check_pair(t, i, j);
    std::string out = "x" + std::to_string(i) + ",x" + std::to_string(j) + "\n";
    for (std::size_t r = 0; r < t.rows(); ++r)
        out += format_real(t.data[static_cast<std::size_t>(i)][r]) + "," +
               format_real(t.data[static_cast<std::size_t>(j)][r]) + "\n";
    return out;
}

std::string plot_svg(const TrajectoryTable& t, int i, int j) {
    check_pair(t, i, j);
    const auto& xs = t.data[static_cast<std::size_t>(i)];
    const auto& ys = t.data[static_cast<std::size_t>(j)];
    const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
    double x0 = *xmin_it, x1 = *xmax_it, y0 = *ymin_it, y1 = *ymax_it;
    if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(y0) || !std::isfinite(y1))
        throw DomainError("trajectory contains non-finite values");
    const bool point = x0 == x1 && y0 == y1;
    if (x1 - x0 == 0) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 == 0) y0 -= 0.5, y1 += 0.5;

    const double w = 640, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
      << w << ' ' << h << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<g stroke=\"black\" stroke-width=\"1\">\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb << "\"/>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb << "\"/>\n";
    s << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<text x=\"" << ml << "\" y=\"" << h - mb + 15 << "\">" << label(x0, x0, x1) << "</text>\n";
    s << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 15 << "\" text-anchor=\"end\">" << label(x1, x0, x1) << "</text>\n";
    s << "<text x=\"" << ml - 5 << "\" y=\"" << h - mb << "\" text-anchor=\"end\">" << label(y0, y0, y1) << "</text>\n";
    s << "<text x=\"" << ml - 5 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\">" << label(y1, y0, y1) << "</text>\n";
    s << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">x" << i
      << "</text>\n";
    s << "<text x=\"15\" y=\"" << (mt + h - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << (mt + h - mb) / 2 << ")\">x" << j << "</text>\n</g>\n";
    if (point) {
        s << "<circle cx=\"" << num(px(xs.front())) << "\" cy=\"" << num(py(ys.front()))
          << "\" r=\"4\" fill=\"steelblue\"/>\n";
    } else {
        s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
        for (std::size_t r = 0; r < xs.size(); ++r) {
            if (r) s << ' ';
            s << num(px(xs[r])) << ',' << num(py(ys[r]));
        }
        s << "\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace rabinovich::cli
