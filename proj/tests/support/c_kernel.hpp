#pragma once

// Builds emitted C with the host compiler and loads it with dlopen.

#include <dlfcn.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

namespace ckernel {

using VectorFn = void (*)(const std::int32_t*, const std::int32_t*, std::int32_t*, std::size_t);
using ScalarFn = void (*)(const std::uint32_t*, const std::uint32_t*, std::uint32_t*, std::size_t);

inline std::string compiler() {
  const char* cc = std::getenv("CC");
  return cc && *cc ? cc : "cc";
}

inline bool compiler_available() { return std::system((compiler() + " --version > /dev/null 2>&1").c_str()) == 0; }

class Library {
 public:
  explicit Library(void* h) : handle_(h) {}
  Library(const Library&) = delete;
  Library& operator=(const Library&) = delete;
  ~Library() { dlclose(handle_); }

  template <typename Fn>
  Fn symbol(const std::string& name) const {
    return reinterpret_cast<Fn>(dlsym(handle_, name.c_str()));
  }

 private:
  void* handle_;
};

/// Compiles `source` as C99 into a shared object and loads it. On failure
/// returns nullptr and sets `error`.
inline std::unique_ptr<Library> build(const std::string& tag, const std::string& source, const std::string& flags,
                                      std::string& error) {
  const auto dir = std::filesystem::temp_directory_path() / "vmont_emitted";
  std::filesystem::create_directories(dir);
  const auto c = dir / (tag + ".c");
  const auto so = dir / (tag + ".so");
  std::ofstream(c, std::ios::binary) << source;
  const std::string cmd = compiler() + " -std=c99 -O2 -shared -fPIC " + flags + " -o " + so.string() + " " +
                          c.string() + " > /dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) {
    error = "compile failed: " + cmd;
    return nullptr;
  }
  void* h = dlopen(so.string().c_str(), RTLD_NOW | RTLD_LOCAL);
  if (!h) {
    error = std::string("dlopen failed: ") + dlerror();
    return nullptr;
  }
  return std::make_unique<Library>(h);
}

/// 16-byte aligned array for the aligned load/store templates.
template <typename T>
class AlignedBuffer {
 public:
  explicit AlignedBuffer(std::size_t n)
      : data_(static_cast<T*>(std::aligned_alloc(16, ((n * sizeof(T) + 15) / 16) * 16))), size_(n) {}
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  ~AlignedBuffer() { std::free(data_); }

  T* data() { return data_; }
  T& operator[](std::size_t i) { return data_[i]; }
  std::size_t size() const { return size_; }

 private:
  T* data_;
  std::size_t size_;
};

}  // namespace ckernel
