#ifndef KPLANE_VERSION_HPP
#define KPLANE_VERSION_HPP

namespace kplane {

inline constexpr const char* version_string = "0.1.0";

}

#endif
