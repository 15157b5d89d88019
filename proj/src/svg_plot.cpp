#include "radmotion/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "radmotion/errors.hpp"

namespace radmotion {

namespace {

constexpr int kWidth = 960;
constexpr int kPanelHeight = 110;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 20;
constexpr int kPanelGap = 26;
constexpr std::size_t kMaxPoints = 2400;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

void write_movement_svg(const std::vector<MovementTrace>& traces,
                        const std::filesystem::path& path) {
    if (traces.empty())
        throw ConfigError("movement plot requires at least one trace");

    const int height =
        kMarginTop + static_cast<int>(traces.size()) * (kPanelHeight + kPanelGap);
    const int plot_w = kWidth - kMarginLeft - kMarginRight;

    double b_max = 0.0;
    for (const MovementTrace& tr : traces)
        for (double v : tr.b_mps) b_max = std::max(b_max, v);
    if (b_max <= 0.0) b_max = 1e-6;

    const std::string tmp = path.string() + ".tmp";
    std::ofstream out(tmp);
    if (!out)
        throw IoError("cannot open '" + tmp + "' for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << height << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < traces.size(); ++p) {
        const MovementTrace& tr = traces[p];
        const int top = kMarginTop + static_cast<int>(p) * (kPanelHeight + kPanelGap);
        const int bottom = top + kPanelHeight;
        const double duration =
            tr.b_mps.empty() ? 1.0 : static_cast<double>(tr.b_mps.size()) / tr.fs_hz;

        out << "<rect x=\"" << kMarginLeft << "\" y=\"" << top << "\" width=\"" << plot_w
            << "\" height=\"" << kPanelHeight
            << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << kMarginLeft << "\" y=\"" << top - 5
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << tr.participant_id
            << " (" << tr.radar_id << ")</text>\n";
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << top + 12
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
            << fmt(b_max * 1e3) << " mm/s</text>\n";
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << bottom
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">0</text>\n";
        out << "<text x=\"" << kWidth - kMarginRight << "\" y=\"" << bottom + 14
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
            << fmt(duration) << " s</text>\n";

        // Max-decimate into at most kMaxPoints buckets.
        const std::size_t n = tr.b_mps.size();
        const std::size_t buckets = std::min<std::size_t>(n, kMaxPoints);
        out << "<polyline fill=\"none\" stroke=\"#1a6dbf\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < buckets; ++i) {
            const std::size_t lo = i * n / buckets;
            const std::size_t hi = std::max(lo + 1, (i + 1) * n / buckets);
            double v = 0.0;
            for (std::size_t t = lo; t < hi && t < n; ++t) v = std::max(v, tr.b_mps[t]);
            const double x =
                kMarginLeft + (buckets == 1 ? 0.0
                                            : static_cast<double>(i) /
                                                  static_cast<double>(buckets - 1) * plot_w);
            const double y = bottom - (v / b_max) * (kPanelHeight - 4);
            out << fmt(x) << ',' << fmt(y) << ' ';
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    out.flush();
    if (!out) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw IoError("failed writing '" + tmp + "'");
    }
    out.close();
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot finalize '" + path.string() + "'");
}

} // namespace radmotion
