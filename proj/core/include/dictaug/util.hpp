#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dictaug/error.hpp"

namespace dictaug {

// ---------------------------------------------------------------------------
// Hashing

inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  return fnv1a64(s.data(), s.size(), h);
}

// ---------------------------------------------------------------------------
// Deterministic RNG
//
// A fixed splitmix64 stream so seeded runs are bitwise reproducible across
// platforms. std::mt19937 would be stable too, but the standard library
// distributions are not; this sidesteps them entirely.

class DetRng {
public:
  explicit DetRng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97f4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Rejection-free (Lemire).
  uint64_t next_below(uint64_t bound) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  uint64_t state_;
};

// ---------------------------------------------------------------------------
// Parallel loop
//
// Splits [0, n) into contiguous chunks, one worker thread per chunk. Chunk
// boundaries depend only on (n, workers), so any per-chunk accumulation that
// is merged in chunk order is deterministic for a fixed worker count.

inline size_t resolve_workers(size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// fn(chunk_index, begin, end)
inline void parallel_chunks(size_t n, size_t workers,
                            const std::function<void(size_t, size_t, size_t)>& fn) {
  workers = resolve_workers(workers);
  if (n == 0) return;
  if (workers > n) workers = n;
  if (workers == 1) {
    fn(0, 0, n);
    return;
  }
  const size_t base = n / workers;
  const size_t extra = n % workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  size_t begin = 0;
  for (size_t w = 0; w < workers; ++w) {
    const size_t len = base + (w < extra ? 1 : 0);
    const size_t end = begin + len;
    threads.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
    begin = end;
  }
  for (auto& t : threads) t.join();
}

// ---------------------------------------------------------------------------
// Little-endian binary IO (file formats are pinned little-endian)

namespace detail {

template <typename T>
struct uint_for;
template <> struct uint_for<uint32_t> { using type = uint32_t; };
template <> struct uint_for<uint64_t> { using type = uint64_t; };
template <> struct uint_for<int32_t> { using type = uint32_t; };
template <> struct uint_for<int64_t> { using type = uint64_t; };
template <> struct uint_for<float> { using type = uint32_t; };
template <> struct uint_for<double> { using type = uint64_t; };

} // namespace detail

template <typename T>
void write_le(std::ostream& os, T value) {
  using U = typename detail::uint_for<T>::type;
  U bits;
  std::memcpy(&bits, &value, sizeof(T));
  unsigned char buf[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  using U = typename detail::uint_for<T>::type;
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw Error("unexpected end of file while reading binary record");
  U bits = 0;
  for (size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(buf[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

inline void write_lp_string(std::ostream& os, std::string_view s) {
  write_le<uint32_t>(os, static_cast<uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_lp_string(std::istream& is) {
  const uint32_t len = read_le<uint32_t>(is);
  std::string s(len, '\0');
  is.read(s.data(), len);
  if (!is) throw Error("unexpected end of file while reading string record");
  return s;
}

} // namespace dictaug
