// Small helpers shared by the CSV exporters. All files are written with LF
// line endings and full double precision (17 significant digits) so that
// re-runs are byte-reproducible.
#ifndef FLOQLAT_CSV_HPP
#define FLOQLAT_CSV_HPP

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace floqlat {

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// Opens for writing in binary mode (keeps LF endings on every platform).
inline std::ofstream open_output_file(const std::string& path) {
    std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    return out;
}

} // namespace floqlat

#endif
