# Controllers Package