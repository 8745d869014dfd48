#ifndef PACEKIT_VERSION_HPP
#define PACEKIT_VERSION_HPP

namespace pacekit {

inline constexpr const char* kVersion = "0.1.0";

// Identifies the generator algorithm, not the library release. Bump only when
// the bit stream produced for a given seed changes; golden files carry it in
// their names.
inline constexpr const char* kGeneratorVersion = "smx64-v1";

}  // namespace pacekit

#endif  // PACEKIT_VERSION_HPP
