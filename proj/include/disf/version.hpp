#ifndef DISF_VERSION_HPP
#define DISF_VERSION_HPP

namespace disf {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
