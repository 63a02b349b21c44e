/* Counts the one bits of x. */
void count_bits(void) {
    int x, y, n = 0;
    y = x;
    if (x) {
        do {
            n++;
            x = x & (x - 1);
        } while (x);
    }
}
