#ifndef JIA_IO_H_
#define JIA_IO_H_

#include <string>
#include <string_view>

namespace jia {

// Writes to "<path>.tmp" and renames over `path`. Throws IoError.
void write_file_atomic(const std::string& path, std::string_view content);

// Throws IoError when the file cannot be read.
std::string read_file(const std::string& path);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace jia

#endif  // JIA_IO_H_
