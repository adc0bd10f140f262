#ifndef FLOQLAT_VERSION_HPP
#define FLOQLAT_VERSION_HPP

namespace floqlat {

inline constexpr const char* version_string = "0.1.0";

} // namespace floqlat

#endif
