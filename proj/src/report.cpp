#include "hawkes/report.hpp"

#include "hawkes/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace hawkes {

std::string report_to_csv(const ConvergenceReport& report) {
    std::string out = "T,v,limit,mean,mean_se,mse,mse_se,exceedance,negative_fraction,replications\n";
    for (const auto& r : report.rows) {
        out += format_double(r.T) + ',' + format_double(r.v) + ',' + format_double(report.limit) + ',' +
               format_double(r.mean) + ',' + format_double(r.mean_se) + ',' + format_double(r.mse) + ',' +
               format_double(r.mse_se) + ',' + format_double(r.exceedance) + ',' +
               format_double(r.negative_fraction) + ',' + std::to_string(r.replications) + '\n';
    }
    return out;
}

nlohmann::json report_to_json(const ConvergenceReport& report) {
    nlohmann::json j;
    j["statistic"] = report.statistic;
    j["mode"] = report.mode;
    j["v"] = report.v;
    j["limit"] = report.limit;
    j["epsilon"] = report.epsilon;
    j["seed"] = report.seed;
    j["spec_digest"] = report.spec_digest;
    j["mse_non_increasing"] = report.mse_non_increasing;
    j["passed"] = report.passed();
    auto& checks = j["checks"] = nlohmann::json::object();
    for (const auto& [name, ok] : report.checks) checks[name] = ok;
    auto& diag = j["diagnostics"] = nlohmann::json::object();
    for (const auto& [name, value] : report.diagnostics) diag[name] = value;
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"T", r.T},
                        {"v", r.v},
                        {"mean", r.mean},
                        {"mean_se", r.mean_se},
                        {"mse", r.mse},
                        {"mse_se", r.mse_se},
                        {"exceedance", r.exceedance},
                        {"negative_fraction", r.negative_fraction},
                        {"replications", r.replications}});
    }
    return j;
}

namespace {

std::string fixed(double x, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const ConvergenceReport& report) {
    if (report.rows.size() < 2) throw std::invalid_argument("convergence plot needs at least two rows");

    constexpr double width = 640, height = 420;
    constexpr double left = 80, right = 24, top = 48, bottom = 64;
    constexpr double floor_mse = 1e-12;

    std::vector<double> lx, ly;
    for (const auto& r : report.rows) {
        lx.push_back(std::log10(r.T));
        ly.push_back(std::log10(std::max(r.mse, floor_mse)));
    }
    // 1/T guide through the first point.
    std::vector<double> guide;
    for (double x : lx) guide.push_back(ly.front() - (x - lx.front()));

    double xmin = std::floor(*std::min_element(lx.begin(), lx.end()));
    double xmax = std::ceil(*std::max_element(lx.begin(), lx.end()));
    if (xmax <= xmin) xmax = xmin + 1;
    double ymin = std::floor(std::min(*std::min_element(ly.begin(), ly.end()), *std::min_element(guide.begin(), guide.end())));
    double ymax = std::ceil(std::max(*std::max_element(ly.begin(), ly.end()), *std::max_element(guide.begin(), guide.end())));
    if (ymax <= ymin) ymax = ymin + 1;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\"" << fixed(height, 0)
        << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << fixed(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << escape_xml(report.statistic) << " LLN, v = " << format_double(report.v)
        << "</text>\n";

    // Axes and decade ticks.
    svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(height - bottom) << "\" x2=\"" << fixed(width - right)
        << "\" y2=\"" << fixed(height - bottom) << "\"/>\n"
        << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left) << "\" y2=\""
        << fixed(height - bottom) << "\"/>\n"
        << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double d = xmin; d <= xmax + 1e-9; d += 1) {
        svg << "<line x1=\"" << fixed(px(d)) << "\" y1=\"" << fixed(height - bottom) << "\" x2=\"" << fixed(px(d))
            << "\" y2=\"" << fixed(height - bottom + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fixed(px(d)) << "\" y=\"" << fixed(height - bottom + 18)
            << "\" text-anchor=\"middle\">1e" << fixed(d, 0) << "</text>\n";
    }
    for (double d = ymin; d <= ymax + 1e-9; d += 1) {
        svg << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(py(d)) << "\" x2=\"" << fixed(left)
            << "\" y2=\"" << fixed(py(d)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(py(d) + 4) << "\" text-anchor=\"end\">1e"
            << fixed(d, 0) << "</text>\n";
    }
    svg << "<text x=\"" << fixed((left + width - right) / 2) << "\" y=\"" << fixed(height - 16)
        << "\" text-anchor=\"middle\">T</text>\n"
        << "<text x=\"18\" y=\"" << fixed((top + height - bottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fixed((top + height - bottom) / 2) << ")\">mean squared error</text>\n"
        << "</g>\n";

    // 1/T reference.
    svg << "<polyline fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"6 4\" points=\"";
    for (std::size_t i = 0; i < lx.size(); ++i) svg << (i ? " " : "") << fixed(px(lx[i])) << ',' << fixed(py(guide[i]));
    svg << "\"/>\n";

    // Empirical MSE.
    svg << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < lx.size(); ++i) svg << (i ? " " : "") << fixed(px(lx[i])) << ',' << fixed(py(ly[i]));
    svg << "\"/>\n";
    for (std::size_t i = 0; i < lx.size(); ++i)
        svg << "<circle cx=\"" << fixed(px(lx[i])) << "\" cy=\"" << fixed(py(ly[i])) << "\" r=\"4\" fill=\"#1f4e9c\"/>\n";

    svg << "<text x=\"" << fixed(width - right) << "\" y=\"" << fixed(top - 6)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">limit = "
        << escape_xml(format_double(report.limit)) << " (dashed: 1/T)</text>\n"
        << "</svg>\n";
    return svg.str();
}

void emit_plot(const ConvergenceReport& report, const std::filesystem::path& path) {
    write_file_atomic(path, render_svg(report));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content, WriteFault fault) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
            if (fault == WriteFault::after_partial_write) {
                out.write(content.data(), static_cast<std::streamsize>(content.size() / 2));
                out.flush();
                throw std::runtime_error("injected fault after partial write of " + path.string());
            }
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.flush();
            if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
        }
        if (fault == WriteFault::before_rename)
            throw std::runtime_error("injected fault before rename of " + path.string());
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hawkes
