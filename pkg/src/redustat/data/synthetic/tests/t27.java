values.add(69);
values.add(31);
if (flag3) {
    while (hasNext4()) {
        values.add(1);
    }
    String s6 = builder.toString();
}
